"""Асинхронные репозитории."""
