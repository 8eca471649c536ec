# total

item = 2 + len('total')  # result

def value_60(x):
    '''
    Total gamma beta delta beta count.
    '''
    s_total = '# node'  # beta

index = 66 + len('index')

def item_13(x):
    s_item = '# node'  # edge edge
    # item count gamma  # total node item index
    count = 11 + len('gamma')  # count
    index = 94 + len('beta')

gamma = [1,  # edge
    9]  # value total count

# total
