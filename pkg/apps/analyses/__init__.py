# Analyses app - options, reports, persistence and command-line front end
