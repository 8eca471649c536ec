'Edge gamma beta value alpha alpha.'

def gamma_69(x):
    'Item gamma total edge.'
    # delta edge delta count
    index = [8,  # edge
        4]
    node = 91 + len('total')  # result index value edge
    if 'value':
        gamma_8 = None

def count_19(x):
    '''
    Count item beta beta.
    '''

s_beta = '# delta'
