"""
Views for the computations API.

Read-only access to cached results; computations are started from the
management commands.
"""

from django_filters.rest_framework import DjangoFilterBackend
from rest_framework import filters, viewsets
from rest_framework.permissions import AllowAny

from .models import CachedComputation
from .serializers import CachedComputationSerializer


class CachedComputationViewSet(viewsets.ReadOnlyModelViewSet):
    """
    Cached computation endpoint.

    list: GET /api/computations/
    retrieve: GET /api/computations/{id}/
    """
    permission_classes = [AllowAny]
    serializer_class = CachedComputationSerializer
    filter_backends = [DjangoFilterBackend, filters.OrderingFilter, filters.SearchFilter]
    filterset_fields = ['kind', 'level', 'weight', 'verified']
    search_fields = ['cache_key']
    ordering_fields = ['level', 'weight', 'created_at']
    ordering = ['-created_at']

    def get_queryset(self):
        return CachedComputation.objects.all()
