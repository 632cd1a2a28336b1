"""
Quillen 定理 B 计算验证工具
================================

在有限截断的单纯集合上, 以可计算的同调谓词检验 Quillen 定理 B 的推广形式.

主要功能:
- 单纯集合与整数同调: 截断单纯集合, Smith 标准形, 诱导映射
- 纤维化检验: Kan / 平凡纤维化的角提升
- 景与预层: 拓扑公理, 层化, 茎
- 定理验证: 定理 B, Puppe 定理, 群完备化
"""

__version__ = "1.0.0"
