"""
Admin configuration for cached computations.
"""

from django.contrib import admin
from django.utils.html import format_html
from .models import CachedComputation


@admin.register(CachedComputation)
class CachedComputationAdmin(admin.ModelAdmin):
    list_display = ['short_key', 'kind', 'level', 'weight', 'verified_badge', 'format_version', 'created_at']
    list_filter = ['kind', 'verified', 'weight', 'format_version']
    search_fields = ['cache_key']
    ordering = ['-created_at']
    readonly_fields = [
        'cache_key', 'kind', 'level', 'weight', 'inputs', 'payload', 'report',
        'verified', 'seed', 'format_version', 'created_at', 'updated_at',
    ]

    fieldsets = (
        ('Computation', {
            'fields': ('kind', 'level', 'weight', 'cache_key', 'format_version', 'seed')
        }),
        ('Result', {
            'fields': ('verified', 'report', 'inputs', 'payload')
        }),
        ('Timestamps', {
            'fields': ('created_at', 'updated_at'),
            'classes': ('collapse',)
        }),
    )

    @admin.display(description="Key")
    def short_key(self, obj):
        return obj.cache_key[:12]

    @admin.display(description="Verified")
    def verified_badge(self, obj):
        color = '#2e7d32' if obj.verified else '#c62828'
        label = 'verified' if obj.verified else 'unverified'
        return format_html('<strong style="color: {};">{}</strong>', color, label)

    def has_add_permission(self, request):
        return False
