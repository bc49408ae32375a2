# Kernel app - prime field, truncated series and matrix rank
