from hypothesis import settings

# group computations are cached on first use, so the first example of a test is slow
settings.register_profile("default", deadline=None)
settings.load_profile("default")
