# Probobs app - probabilistic power-series observability test
