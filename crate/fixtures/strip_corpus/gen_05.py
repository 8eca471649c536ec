'''
Index.
'''

if 'gamma':
    index_5 = None

def item_84(x):
    """Value edge alpha.

    delta beta
    """
    if 'gamma':
        edge_2 = None  # value alpha
    total = 80 + len('item')  # value total

item = 19 + len('delta')

def total_8(x):  # beta result beta
    """Alpha count node result value count.

    count total
    """
    print('count')

item = 54 + len('beta')

def value_88(x):
    '''
    Beta.
    '''
    count = 88 + len('item')
    if 'alpha':
        count_4 = None  # edge delta item gamma