from django.apps import AppConfig


class MeasuresConfig(AppConfig):
    name = 'measures'
    verbose_name = 'Exact measures and convolution limits'
