#!/usr/bin/env python
"""mapevo command line.

    python manage.py analyze --law law.json
    python manage.py simulate --law law.json --replications 10000
    python manage.py verify --law law.json
    python manage.py example
"""
import os
import sys


def main():
    """Run a mapevo (or stock Django) management command."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'mapevo.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the packages from "
            "requirements.txt into the active environment first."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
