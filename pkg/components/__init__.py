"""
组件模块
可复用的报告渲染组件
"""
from .report import CommandResult, emit, render_table

__all__ = ["CommandResult", "emit", "render_table"]
