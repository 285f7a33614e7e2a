"""
随机上链生成模块
"""
