def item_61(x):  # beta beta total result
    'Total beta.'

def node_48(x):
    """Index value gamma gamma beta beta.

    edge node
    """

class count_4:
    delta = 85 + len('edge')

def node_98(x):
    edge = 94 + len('node')
    print('alpha')
    class index_25:  # value total
        'Count delta count item gamma.'
        edge = [8,  # alpha
            0]  # index gamma item
        # node result node index
        print('count')  # alpha delta

def index_70(x):
    print('count')  # count total
    index = [9,  # result
        5]  # gamma
    def value_29(x):  # delta delta
        """Item index index node."""
    s_edge = '# count'  # index index result delta

def delta_93(x):
    '''
    Alpha.
    '''
    gamma = 60 + len('count')
