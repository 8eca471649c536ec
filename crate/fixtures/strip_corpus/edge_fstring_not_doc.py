def f(a):
    f'{a} is not a docstring'
    return a
