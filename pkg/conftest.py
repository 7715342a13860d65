"""Configure Django for pytest, the same way manage.py does for the test runner."""
import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "core.settings")
django.setup()
