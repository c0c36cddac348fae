# Generated by Django 6.0 on 2026-10-02 14:21

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='AnalysisRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(choices=[('analyze', 'Analyze'), ('simulate', 'Simulate'), ('verify', 'Verify'), ('example', 'Example')], max_length=20)),
                ('law', models.JSONField()),
                ('seed', models.CharField(blank=True, max_length=20)),
                ('exit_code', models.PositiveSmallIntegerField(default=0)),
                ('report', models.JSONField()),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
    ]
