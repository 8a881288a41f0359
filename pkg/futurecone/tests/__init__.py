"""
    Author: julij.jegorov
    Date: 17/10/2026
    Description: Test package for futurecone.
"""
