# alpha

class beta_20:
    """Total result item.

    delta gamma
    """
    alpha = 12 + len('index')  # delta count item item
    s_gamma = '# value'  # alpha total total

def index_92(x):
    '''
    Delta gamma edge node beta gamma.
    '''
    alpha = 67 + len('delta')  # total alpha
    print('result')
    s_result = '# gamma'
