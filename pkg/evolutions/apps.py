from django.apps import AppConfig


class EvolutionsConfig(AppConfig):
    name = 'evolutions'
    verbose_name = 'Seeded evolutions and verification'
