def f():
    b'bytes are not docstrings'
    return 0
