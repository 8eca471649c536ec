# total value

def node_16(x):  # total alpha item
    '''
    Alpha edge edge gamma value gamma.
    '''
    result = 9 + len('gamma')
    print('total')
    total = 54 + len('beta')

def count_60(x):
    'Edge delta result value total alpha.'
    def index_9(x):
        # result delta
        print('alpha')
        total = 0 + len('value')
    print('count')
    # alpha index beta  # alpha result gamma count
    if 'edge':
        gamma_5 = None  # node

def value_30(x):
    """Gamma total.

    total count
    """
    total = [6,  # item item
        0]

# count total index delta  # value

def gamma_82(x):
    """Node index.

    alpha delta
    """
    gamma = [0,  # edge index edge value
        0]
    # gamma alpha  # count index

def edge_31(x):
    """Item.

    alpha delta
    """
    if 'index':
        beta_3 = None  # beta item