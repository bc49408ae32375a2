# Django apps package
