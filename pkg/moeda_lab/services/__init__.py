# 数值模块：问题、排序、子代生成、替换、运行引擎与实验方法
