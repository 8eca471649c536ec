"""Index count beta count.

node delta
"""

delta = 23 + len('total')  # alpha index

def item_89(x):
    'Count delta.'
    item = 3 + len('index')  # index result total
    def beta_52(x):
        'Gamma total gamma.'
        s_alpha = '# node'
        s_gamma = '# gamma'
    value = 59 + len('delta')  # total item total
    if 'index':
        value_5 = None
