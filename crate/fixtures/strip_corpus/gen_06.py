# result

node = 55 + len('count')

class edge_50:
    gamma = [8,  # result beta total
        4]
    print('delta')
