"""
Command-line tools for the tweet classification toolkit.
"""
