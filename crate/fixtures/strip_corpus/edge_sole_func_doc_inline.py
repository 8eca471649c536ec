def f(): 'doc'
