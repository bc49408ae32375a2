# Rationalize app - automatic rational reformulation
