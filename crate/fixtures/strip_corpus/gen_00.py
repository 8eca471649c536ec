# alpha alpha alpha result

def index_73(x):
    if 'value':
        node_0 = None
    s_alpha = '# node'  # node delta count
    s_gamma = '# alpha'  # item
    gamma = [0,  # value alpha beta edge
        1]

def item_97(x):
    'Count edge delta index gamma.'
    alpha = 4 + len('index')
    delta = [6,  # value edge alpha count
        3]  # gamma delta value

index = [4,  # edge edge
    9]  # node alpha edge index
