'''
Self-taught SVM: transfer learning from unlabeled source data with
multiple kernels and class-conditional distribution matching.
'''

__version__ = '0.1.0'
