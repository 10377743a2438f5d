"""
Django settings for the VML toolchain project.

The project has no web front end and no database: Django provides the
settings layer, the management commands that form the `vml` CLI and the
test runner.
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'vml-toolchain-local-key')

DEBUG = bool(int(os.environ.get('DEBUG', 0)))

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'rest_framework',

    'core',
    'language',
    'analysis',
    'compiler',
    'solver',
    'runtime',
]

DATABASES = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
    'COERCE_DECIMAL_TO_STRING': False,
}


# VML toolchain

VML_MODELS_DIR = Path(os.environ.get('VML_MODELS_DIR', BASE_DIR / 'vml_models'))

# Chord segments per nonlinear definition function.
VML_SEGMENTS = int(os.environ.get('VML_SEGMENTS', 5))

# Joint grid points scanned per function before uniform coarsening.
VML_MAX_GRID_POINTS = int(os.environ.get('VML_MAX_GRID_POINTS', 10 ** 6))

# Largest joint domain the brute-force oracle will enumerate.
VML_BRUTE_FORCE_LIMIT = int(os.environ.get('VML_BRUTE_FORCE_LIMIT', 10 ** 7))

VML_EXACT_OBJECTIVE = bool(int(os.environ.get('VML_EXACT_OBJECTIVE', 0)))

VML_LOG_LEVEL = os.environ.get('VML_LOG_LEVEL', 'WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        app: {
            'handlers': ['console'],
            'level': VML_LOG_LEVEL,
            'propagate': False,
        }
        for app in ('core', 'language', 'analysis', 'compiler', 'solver',
                    'runtime')
    },
}
