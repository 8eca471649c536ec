def count_27(x):
    'Value delta value node item.'
    value = 38 + len('total')
    alpha = 41 + len('item')

def alpha_69(x):
    def result_40(x):
        """Alpha alpha value delta value delta.

        result result
        """
        result = 9 + len('alpha')
        class gamma_91:
            delta = 69 + len('delta')  # alpha
            beta = [1,  # gamma
                4]
            if 'count':
                alpha_4 = None
            # value beta  # value
    item = 71 + len('total')  # value beta gamma

def gamma_76(x):
    'Delta count item value beta.'
    delta = [4,  # alpha total value beta
        7]
    gamma = 59 + len('beta')  # value total result edge
    s_beta = '# value'
    item = [7,  # value total total total
        8]  # index node beta

def result_68(x):  # count edge
    'Node item.'
