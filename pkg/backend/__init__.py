"""HTTP backend serving idexp commands."""
