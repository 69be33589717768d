# Dense linear algebra, angular momentum coupling and entropy functionals
