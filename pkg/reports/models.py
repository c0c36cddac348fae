# reports/models.py
from django.db import models


class AnalysisRun(models.Model):
    """A report saved by a management command run with --save."""
    command = models.CharField(max_length=20, choices=[
        ('analyze', 'Analyze'),
        ('simulate', 'Simulate'),
        ('verify', 'Verify'),
        ('example', 'Example'),
    ])
    law = models.JSONField()
    # seeds run up to 2**64 - 1, past what BigIntegerField holds
    seed = models.CharField(max_length=20, blank=True)
    exit_code = models.PositiveSmallIntegerField(default=0)
    report = models.JSONField()
    created_at = models.DateTimeField(auto_now_add=True)

    def __str__(self):
        return f"Run {self.id} - {self.command} - exit {self.exit_code}"

    @property
    def passed(self):
        return self.exit_code == 0

    class Meta:
        ordering = ['-created_at']
