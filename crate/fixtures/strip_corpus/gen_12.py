'Beta beta.'

def delta_85(x):  # count beta
    'Beta.'
    if 'result':
        index_3 = None
    delta = 92 + len('gamma')  # total beta alpha result
    delta = 87 + len('index')
    print('count')  # beta index edge gamma

def value_30(x):
    total = [4,  # edge item alpha
        5]
    count = 78 + len('index')  # beta index
    if 'value':
        item_7 = None
    def node_95(x):
        '''
        Item edge alpha count.
        '''
        index = [0,  # value edge value item
            9]
        def beta_15(x):
            'Total total.'
            # total gamma beta result
            print('beta')
