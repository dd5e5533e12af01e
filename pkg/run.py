#!/usr/bin/env python3
"""
Roy 准则分析器启动脚本
提供便捷的启动方式
"""
import sys
from pathlib import Path

# 确保仓库根目录在Python路径中
sys.path.insert(0, str(Path(__file__).resolve().parent))

from src.main import main

if __name__ == '__main__':
    sys.exit(main())
