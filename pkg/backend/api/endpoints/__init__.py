"""
Paquete de endpoints de la API.

Contiene los endpoints para resolver juegos, verificar estrategias y consultar
los juegos de ejemplo.
"""
