# Systems tests
