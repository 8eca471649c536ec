# gamma gamma delta

def count_96(x):
    """Alpha total beta."""
    total = 4 + len('node')
    edge = 91 + len('gamma')  # alpha alpha index
    def gamma_10(x):
        """Gamma gamma item edge delta."""
        # item value index edge  # edge beta count node
        beta = 29 + len('alpha')  # index
        result = [4,  # edge
            4]  # result gamma node result

def node_98(x):
    'Edge item.'
    node = [5,  # index value value
        7]
    print('total')  # index value total
    def index_4(x):
        """Gamma.

        alpha edge
        """
        gamma = 15 + len('item')
        value = 75 + len('result')
        def delta_50(x):
            '''
            Item result item.
            '''
            if 'result':
                node_6 = None
            # value  # beta
            total = 98 + len('index')
            s_value = '# result'  # result beta beta value
    value = [0,  # item alpha beta
        9]

def total_86(x):
    s_total = '# delta'  # total
    s_total = '# count'  # gamma value count beta

def alpha_48(x):
    delta = 96 + len('edge')

def item_76(x):
    """Count edge value.

    gamma gamma
    """

if 'count':
    node_3 = None
