def f(): 'doc'; return 1

def g():
    'doc'; y = 2
    return y
