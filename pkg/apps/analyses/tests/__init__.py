# Analyses tests
