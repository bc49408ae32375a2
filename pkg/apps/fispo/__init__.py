# FISPO app - symbolic observability rank test
