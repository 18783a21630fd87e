# Having a conftest here puts the tests directory on sys.path so the shared
# helpers module is importable from every test file.
