"""
Django settings for the mapevo project.

mapevo analyses random compositions of maps of a finite set: it is driven
entirely through management commands (see manage.py), there is no web surface.

Deployment knobs come from the environment; an optional .env file next to
manage.py is loaded first.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(BASE_DIR / '.env')


def env_bool(name, default=False):
    value = os.environ.get(name)
    if value is None:
        return default
    return value.strip().lower() in ('1', 'true', 'yes', 'on')


# Only used for signing, which the commands never do.
SECRET_KEY = os.environ.get('MAPEVO_SECRET_KEY', 'mapevo-local-only-key')

DEBUG = env_bool('MAPEVO_DEBUG')

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    "transforms",     # maps of V, semigroup closure, Rees decomposition
    "measures",       # exact measures, convolution limits
    "cliques",        # F-cliques, W, invariant multiparticle laws
    "evolutions",     # seeded evolutions and verification
    "reports",        # management commands and stored runs
]

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Database
# sqlite by default; MAPEVO_DB_ENGINE=mysql switches to the mysqlclient driver.

if os.environ.get('MAPEVO_DB_ENGINE', 'sqlite') == 'mysql':
    DATABASES = {
        'default': {
            'ENGINE': 'django.db.backends.mysql',
            'NAME': os.environ.get('MAPEVO_DB_NAME', 'mapevo_db'),
            'USER': os.environ.get('MAPEVO_DB_USER', 'mapevo_user'),
            'PASSWORD': os.environ.get('MAPEVO_DB_PASSWORD', ''),
            'HOST': os.environ.get('MAPEVO_DB_HOST', '127.0.0.1'),
            'PORT': os.environ.get('MAPEVO_DB_PORT', '3306'),
            'OPTIONS': {
                'init_command': "SET sql_mode='STRICT_TRANS_TABLES'",
                'charset': 'utf8mb4',
            },
        }
    }
else:
    DATABASES = {
        'default': {
            'ENGINE': 'django.db.backends.sqlite3',
            'NAME': os.environ.get('MAPEVO_DB_NAME', str(BASE_DIR / 'mapevo.sqlite3')),
        }
    }


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Logging: everything to stderr, stdout is reserved for reports.

MAPEVO_LOG_LEVEL = os.environ.get('MAPEVO_LOG_LEVEL', 'WARNING')

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
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'django': {'handlers': ['console'], 'level': 'WARNING'},
        'mapevo': {'handlers': ['console'], 'level': MAPEVO_LOG_LEVEL},
        'transforms': {'handlers': ['console'], 'level': MAPEVO_LOG_LEVEL},
        'measures': {'handlers': ['console'], 'level': MAPEVO_LOG_LEVEL},
        'cliques': {'handlers': ['console'], 'level': MAPEVO_LOG_LEVEL},
        'evolutions': {'handlers': ['console'], 'level': MAPEVO_LOG_LEVEL},
        'reports': {'handlers': ['console'], 'level': MAPEVO_LOG_LEVEL},
    },
}


# Analysis defaults

MAPEVO_ELEMENT_CAP = 10**6          # closure size before giving up
MAPEVO_ORACLE_TOL = 1e-12           # float limit oracle, lag difference
MAPEVO_ORACLE_MAX_ITER = 100000
MAPEVO_SEED = 42
MAPEVO_ALPHA = 0.001                # significance of every statistical check
MAPEVO_REPLICATIONS = 10000
MAPEVO_WINDOW = 3                   # width of the N-window in independence tests
MAPEVO_K_MIN = -10
MAPEVO_K_MAX = 0
MAPEVO_PATH_STEPS = 1000            # length of paths used for exact path checks
MAPEVO_MIXING_LENGTHS = (5, 20, 50)
