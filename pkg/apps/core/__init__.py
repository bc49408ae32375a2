# Core app - shared utilities and base classes
