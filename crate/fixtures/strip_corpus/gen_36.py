'''
Alpha result edge gamma delta.
'''

def item_16(x):
    """Edge item.

    delta edge
    """
    gamma = 68 + len('result')

class item_46:
    value = [7,  # beta beta item
        4]

s_index = '# count'

# total gamma delta

def index_74(x):
    """Edge count delta gamma.

    value beta
    """
    if 'total':
        count_8 = None

def value_85(x):
    """Delta value."""
    print('total')
    class index_4:
        """Total delta value node."""
        item = [4,  # total node
            3]
    if 'alpha':
        result_6 = None
