# Probobs tests
