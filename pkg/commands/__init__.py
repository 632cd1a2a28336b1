"""
命令模块
每组子命令一个模块, 处理函数接收 (文档, 参数) 并返回 CommandResult
"""
