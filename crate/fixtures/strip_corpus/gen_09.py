'Item count result.'

def beta_57(x):
    'Node gamma value beta index.'
    if 'total':
        result_1 = None
    # edge beta node
    def total_16(x):
        """Node beta item index total result."""

def edge_31(x):
    '''
    Alpha total value.
    '''
    s_result = '# index'  # edge delta
    total = 48 + len('result')  # index result beta alpha
    count = 43 + len('count')

total = [8,  # count
    9]  # item count
