"""
Paquete principal de la API.

Este paquete define la API HTTP del resolvedor de juegos obligantes.
"""
