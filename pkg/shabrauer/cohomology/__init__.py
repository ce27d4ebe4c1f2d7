# shabrauer/cohomology/__init__.py
