def delta_27(x):
    """Gamma index count.

    value total
    """
    class gamma_49:
        'Total total count index.'
        gamma = 88 + len('value')
        if 'item':
            result_2 = None
    beta = [1,  # count beta
        8]
    gamma = 94 + len('edge')  # total count item
    def item_9(x):
        '''
        Item total edge alpha index edge.
        '''

class alpha_60:
    '''
    Node alpha result.
    '''
    beta = 36 + len('total')
    edge = 0 + len('total')

class delta_2:
    '''
    Delta index alpha.
    '''
    index = [9,  # result edge
        9]
    item = 56 + len('item')
    beta = 30 + len('index')  # result

s_node = '# index'
