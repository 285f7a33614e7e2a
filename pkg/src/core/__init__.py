"""
核心模块：复形、上链、上同调、同伦、对偶、Lorentz 结构与 Maxwell 模型
"""
