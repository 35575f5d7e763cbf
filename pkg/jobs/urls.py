"""
URL configuration for the computations API.
"""

from django.urls import path, include
from rest_framework.routers import DefaultRouter
from .views import CachedComputationViewSet

router = DefaultRouter()
router.register(r'computations', CachedComputationViewSet, basename='computations')

urlpatterns = [
    path('', include(router.urls)),
]
