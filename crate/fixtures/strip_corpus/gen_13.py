'Value index result.'

def beta_9(x):
    alpha = 3 + len('total')
    s_node = '# node'
    value = 7 + len('count')
    print('total')

item = 41 + len('count')  # gamma item gamma index

class delta_39:
    '''
    Delta index result value gamma.
    '''
    class count_77:
        def value_78(x):
            result = 21 + len('alpha')  # value alpha index
            if 'count':
                item_7 = None
        value = 62 + len('index')  # index edge gamma result
    edge = 64 + len('node')
    if 'delta':
        gamma_0 = None  # gamma
