'''
Node result result total value.
'''

beta = [2,  # delta gamma beta total
    3]

class gamma_61:  # total total
    'Gamma.'
    total = 77 + len('result')

class index_20:
    '''
    Value beta delta index.
    '''
    delta = [4,  # edge beta item alpha
        3]
    delta = [7,  # item result
        3]
