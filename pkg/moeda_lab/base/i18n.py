"""国际化消息定义

按模块组织所有国际化消息，使用 I18nMessage 对象。
"""

from moeda_lab.utils.schemas import I18nMessage


class CommonI18n:
    """通用国际化消息"""

    UNEXPECTED_ERROR = I18nMessage(
        zh_cn="[{summary}] 内部错误: {error}",
        en_us="[{summary}] Internal error: {error}",
    )

    PARTIAL_RESULT = I18nMessage(
        zh_cn="[{summary}] 部分结果: {error}",
        en_us="[{summary}] Partial result: {error}",
    )

    FAILED = I18nMessage(
        zh_cn="[{summary}] 失败: {error}",
        en_us="[{summary}] Failed: {error}",
    )


class CommandSummaryI18n:
    """命令摘要国际化"""

    EVALUATE = I18nMessage(zh_cn="评估基因型", en_us="Evaluate genome")

    ORACLE = I18nMessage(zh_cn="穷举 Pareto 前沿", en_us="Brute-force Pareto front")

    RUN = I18nMessage(zh_cn="单次运行", en_us="Single run")

    BISECT = I18nMessage(zh_cn="二分求最小种群", en_us="Bisection for minimum size")

    SWEEP = I18nMessage(zh_cn="可扩展性扫描", en_us="Scalability sweep")

    PREDICT = I18nMessage(zh_cn="种群规模预测", en_us="Population-size prediction")

    NICHE_PROB = I18nMessage(zh_cn="小生境保持概率", en_us="Niche maintenance")

    GROWTH = I18nMessage(zh_cn="冲突子结构增长率", en_us="Growth-rate schedule")


class CoreI18n:
    """基因型 / 种群相关消息"""

    NOT_POSITIVE = I18nMessage(
        zh_cn="{name} 必须 >= 1，实际为 {value}",
        en_us="{name} must be >= 1, got {value}",
    )

    LENGTH_MISMATCH = I18nMessage(
        zh_cn="基因型长度不一致: {left} != {right}",
        en_us="Genome length mismatch: {left} != {right}",
    )

    NOT_BINARY = I18nMessage(
        zh_cn="基因型只能包含 0 和 1", en_us="Genome bits must be 0 or 1"
    )

    SHAPE_INVALID = I18nMessage(
        zh_cn="种群数组形状无效: {shape}",
        en_us="Invalid population array shape: {shape}",
    )


class ProblemI18n:
    """测试问题相关消息"""

    U_OUT_OF_RANGE = I18nMessage(
        zh_cn="1 的个数 u={u} 超出 [0, {k}]",
        en_us="Ones-count u={u} outside [0, {k}]",
    )

    K_TOO_SMALL = I18nMessage(
        zh_cn="陷阱函数要求 k >= 2，实际为 {k}",
        en_us="Trap functions need k >= 2, got {k}",
    )

    D_OUT_OF_RANGE = I18nMessage(
        zh_cn="信号差 d={d} 必须位于 (0, 1)",
        en_us="Signal difference d={d} must lie in (0, 1)",
    )

    NO_DEFAULT_D = I18nMessage(
        zh_cn="k={k} 没有默认的 d，请显式给出 --d",
        en_us="No default d for k={k}; pass --d explicitly",
    )

    MD_OUT_OF_RANGE = I18nMessage(
        zh_cn="冲突子结构数 m_d={m_d} 必须位于 [0, m={m}]",
        en_us="Competing substructures m_d={m_d} must lie in [0, m={m}]",
    )

    BAD_PERMUTATION = I18nMessage(
        zh_cn="permutation 必须是 0..{last} 的一个排列",
        en_us="permutation must be a permutation of 0..{last}",
    )

    INVALID_SPEC = I18nMessage(
        zh_cn="问题定义字段 {field} 无效: {error}",
        en_us="Invalid problem field {field}: {error}",
    )

    GENOTYPE_CAP_EXCEEDED = I18nMessage(
        zh_cn="代表解个数 {count} 超过上限 {cap}",
        en_us="Representative count {count} exceeds cap {cap}",
    )

    ORACLE_TOO_LONG = I18nMessage(
        zh_cn="穷举要求 ℓ <= {limit}，实际为 {ell}",
        en_us="Brute-force oracle needs ell <= {limit}, got {ell}",
    )


class ParetoI18n:
    """非支配排序相关消息"""

    UNEVALUATED = I18nMessage(
        zh_cn="种群尚未评估目标值", en_us="Population objectives are not evaluated"
    )

    UNRANKED = I18nMessage(
        zh_cn="个体尚未设置等级或拥挤距离",
        en_us="Rank or crowding distance is not set",
    )

    EMPTY_POPULATION = I18nMessage(
        zh_cn="种群为空", en_us="Population is empty"
    )


class ModelI18n:
    """概率模型相关消息"""

    POPSIZE_TOO_SMALL = I18nMessage(
        zh_cn="模型复杂度要求 n >= 2，实际为 {n}",
        en_us="Model complexity needs n >= 2, got {n}",
    )

    PROBABILITY_RANGE = I18nMessage(
        zh_cn="概率 {name}={value} 必须位于 [0, 1]",
        en_us="Probability {name}={value} must lie in [0, 1]",
    )

    MODEL_INVALID = I18nMessage(
        zh_cn="边缘积模型无效: {reason}",
        en_us="Invalid marginal product model: {reason}",
    )


class ReplacementI18n:
    """替换策略相关消息"""

    WINDOW_TOO_LARGE = I18nMessage(
        zh_cn="窗口 w={w} 超过种群规模 {n}",
        en_us="Window w={w} exceeds population size {n}",
    )

    SIZE_MISMATCH = I18nMessage(
        zh_cn="子代数 {offspring} 超过父代数 {parents}",
        en_us="Offspring count {offspring} exceeds parent count {parents}",
    )


class SizingI18n:
    """种群规模实验相关消息"""

    M_TOO_SMALL = I18nMessage(
        zh_cn="EDA 规模公式要求 m >= 2，实际为 {m}",
        en_us="EDA sizing needs m >= 2, got {m}",
    )

    NOPT_TOO_SMALL = I18nMessage(
        zh_cn="小生境规模公式要求 n_opt >= 2，实际为 {n_opt}",
        en_us="Niching sizing needs n_opt >= 2, got {n_opt}",
    )

    INFEASIBLE_AT_BUDGET = I18nMessage(
        zh_cn="种群规模上限 {n_max} 内未通过，最后失败的 n={n}",
        en_us="No pass within n_max={n_max}; last failing n={n}",
    )

    FIT_NEEDS_POINTS = I18nMessage(
        zh_cn="拟合至少需要 3 个点，实际为 {count}",
        en_us="Fitting needs at least 3 points, got {count}",
    )

    FIT_NON_POSITIVE = I18nMessage(
        zh_cn="拟合数据必须全部为正", en_us="Fitting data must be positive"
    )

    EMPTY_FAMILY = I18nMessage(zh_cn="问题族为空", en_us="Problem family is empty")

    BISECT_DONE = I18nMessage(
        zh_cn="{problem}: n_min = {mean:.1f} ± {std:.1f}（{repeats} 次二分）",
        en_us="{problem}: n_min = {mean:.1f} ± {std:.1f} over {repeats} bisections",
    )

    SWEEP_DONE = I18nMessage(
        zh_cn="扫描完成，共 {records} 条记录",
        en_us="Sweep finished with {records} record(s)",
    )

    SWEEP_PARTIAL = I18nMessage(
        zh_cn="{failed} 个问题规模在预算内不可行",
        en_us="{failed} problem size(s) infeasible at budget",
    )


class CliI18n:
    """命令行相关消息"""

    INVALID_VALUE = I18nMessage(
        zh_cn="参数 {field} 无效: {error}",
        en_us="Invalid value for {field}: {error}",
    )

    MISSING_FIELD = I18nMessage(
        zh_cn="命令 {command} 缺少参数 {field}",
        en_us="Command {command} requires {field}",
    )

    CONFLICTING_PROBLEM_FIELDS = I18nMessage(
        zh_cn="问题 {kind} 不能同时给出 --m 和 --ell",
        en_us="Problem {kind} takes either --m or --ell, not both",
    )

    UNKNOWN_KEY = I18nMessage(
        zh_cn="未知配置项: {key}", en_us="Unknown config key: {key}"
    )

    CONFIG_FILE_NOT_FOUND = I18nMessage(
        zh_cn="配置文件不存在: {path}", en_us="Config file not found: {path}"
    )

    CONFIG_LINE_INVALID = I18nMessage(
        zh_cn="配置文件 {path} 第 {line} 行不是 key=value",
        en_us="Config file {path} line {line} is not key=value",
    )

    OUTPUT_UNWRITABLE = I18nMessage(
        zh_cn="无法写入输出 {path}: {error}",
        en_us="Cannot write output {path}: {error}",
    )

    CSV_HEADER_MISMATCH = I18nMessage(
        zh_cn="CSV 表头不匹配: {header}", en_us="CSV header mismatch: {header}"
    )
