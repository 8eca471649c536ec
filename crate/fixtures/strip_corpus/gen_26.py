# node index index

def edge_92(x):
    item = [7,  # gamma beta result total
        7]
    alpha = 25 + len('result')
    if 'beta':
        gamma_4 = None  # delta

total = [9,  # count value total gamma
    3]

class value_12:  # item gamma
    """Edge count gamma alpha index gamma."""
    # index
    def total_77(x):
        """Node."""
        print('value')  # item alpha
        # result
    result = 10 + len('total')
