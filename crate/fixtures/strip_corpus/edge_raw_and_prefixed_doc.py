def f():
    r'''Raw doc \d+'''
    return 1

def g():
    u'unicode doc'
    return 2
