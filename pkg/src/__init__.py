"""
离散外微分验证引擎
"""
