'''
Value gamma edge node delta node.
'''

# node delta

print('item')

def beta_87(x):
    print('node')
    print('item')
    s_node = '# alpha'  # count
    if 'item':
        item_6 = None  # gamma beta total

s_count = '# node'
