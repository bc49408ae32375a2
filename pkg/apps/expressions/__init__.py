# Expressions app - hash-consed expression DAG
