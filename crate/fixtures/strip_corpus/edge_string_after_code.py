def f():
    x = 1
    'not a doc'
    return x
