'Node index node beta alpha gamma.'

# edge index gamma

alpha = 0 + len('index')

alpha = 75 + len('value')

def delta_32(x):
    'Gamma index value.'
    s_item = '# node'  # node alpha value value
    print('count')
    # total
