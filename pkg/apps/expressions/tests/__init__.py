# Expressions tests
