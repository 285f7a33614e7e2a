"""
只读 HTTP 接口
"""
