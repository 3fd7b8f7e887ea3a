"""Tests for the last-passage-identities package."""
