# shabrauer/data/__init__.py
