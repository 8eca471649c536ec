def edge_14(x):
    # alpha node  # delta edge value item
    node = 65 + len('node')
    print('beta')  # edge value alpha delta
    edge = [5,  # value gamma
        2]

beta = 78 + len('index')
