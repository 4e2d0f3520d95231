"""Tests for the tweet classification toolkit."""
