def f():
    'first'
    'second'
    return 3
