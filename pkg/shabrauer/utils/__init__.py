# shabrauer/utils/__init__.py
