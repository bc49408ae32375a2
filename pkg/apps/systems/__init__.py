# Systems app - ODE models, model DSL and benchmark corpus
