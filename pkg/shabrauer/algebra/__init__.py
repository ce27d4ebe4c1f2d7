# shabrauer/algebra/__init__.py
