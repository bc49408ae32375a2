# Kernel tests
