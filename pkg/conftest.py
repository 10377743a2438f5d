"""Configure Django before pytest collects the app test modules."""

import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'app.settings')
django.setup()
