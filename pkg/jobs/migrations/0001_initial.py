from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='CachedComputation',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='Created at')),
                ('updated_at', models.DateTimeField(auto_now=True, verbose_name='Updated at')),
                ('kind', models.CharField(choices=[('AL_MATRIX', 'Atkin-Lehner matrix'), ('SL2_TABLE', 'SL2 action table'), ('CURVE_MODEL', 'Curve model')], max_length=20, verbose_name='Kind')),
                ('cache_key', models.CharField(help_text='SHA-256 of the inputs and fixture contents', max_length=64, unique=True, verbose_name='Cache key')),
                ('level', models.PositiveIntegerField(verbose_name='Level')),
                ('weight', models.PositiveIntegerField(verbose_name='Weight')),
                ('inputs', models.JSONField(default=dict, verbose_name='Inputs')),
                ('payload', models.JSONField(verbose_name='Payload')),
                ('report', models.JSONField(default=dict, verbose_name='Verification report')),
                ('verified', models.BooleanField(default=False, verbose_name='Verified')),
                ('seed', models.BigIntegerField(blank=True, null=True, verbose_name='Random seed')),
                ('format_version', models.PositiveSmallIntegerField(default=1, verbose_name='Format version')),
            ],
            options={
                'verbose_name': 'Cached computation',
                'verbose_name_plural': 'Cached computations',
                'ordering': ['-created_at'],
                'abstract': False,
                'indexes': [models.Index(fields=['kind', 'level', 'weight'], name='jobs_cache_kind_lvl_wt_idx')],
            },
        ),
    ]
