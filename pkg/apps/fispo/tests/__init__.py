# Fispo tests
