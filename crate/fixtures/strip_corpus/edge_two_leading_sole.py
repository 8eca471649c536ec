def f():
    'first'
    'second'
