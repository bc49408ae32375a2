from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='AnalysisRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True, help_text='When the record was stored')),
                ('updated_at', models.DateTimeField(auto_now=True, help_text='Last change to the record')),
                ('model_id', models.CharField(max_length=200)),
                ('algorithm', models.CharField(choices=[('fispo', 'FISPO'), ('probobs', 'ProbObsTest')], max_length=20)),
                ('status', models.CharField(choices=[('fispo', 'FISPO'), ('deficient', 'Deficient'), ('inconclusive', 'Inconclusive')], max_length=20)),
                ('stop_reason', models.CharField(max_length=40)),
                ('rank', models.PositiveIntegerField(blank=True, null=True)),
                ('dimension', models.PositiveIntegerField()),
                ('seed', models.BigIntegerField()),
                ('prime', models.DecimalField(decimal_places=0, max_digits=40)),
                ('duration', models.FloatField()),
                ('options', models.JSONField(default=dict)),
                ('report', models.JSONField()),
            ],
            options={
                'db_table': 'analysis_runs',
                'ordering': ['-created_at'],
                'indexes': [
                    models.Index(fields=['model_id', 'algorithm'], name='analysis_ru_model_i_5c1f0e_idx'),
                    models.Index(fields=['status'], name='analysis_ru_status_8d2b41_idx'),
                    models.Index(fields=['created_at'], name='analysis_ru_created_3a9e7c_idx'),
                ],
            },
        ),
    ]
