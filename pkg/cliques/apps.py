from django.apps import AppConfig


class CliquesConfig(AppConfig):
    name = 'cliques'
    verbose_name = 'F-cliques and invariant laws'
