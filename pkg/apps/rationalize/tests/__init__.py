# Rationalize tests
