a = '# not a comment'
b = "#also not"  # but this is
c = '''
# inside triple
'''
