'''
Delta alpha.
'''

# beta

# result edge gamma

def alpha_69(x):  # index total
    """Index gamma gamma value."""

class beta_79:
    'Total delta node edge result count.'
    s_beta = '# index'
    print('alpha')
    count = 86 + len('node')
    index = 70 + len('total')

def node_37(x):
    """Count item edge alpha.

    index beta
    """
    s_value = '# total'
