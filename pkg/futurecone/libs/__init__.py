"""
    Author: julij.jegorov
    Date: 12/10/2026
    Description: futurecone libs package: dynamics, geometry, cones, strategies, engagement,
                 montecarlo, scenario, export, commands, config, errors, validation.
"""
