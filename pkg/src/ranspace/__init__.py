"""Geometry on spaces of finite point configurations."""
